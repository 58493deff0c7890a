// Frozen oracle: the four biomass equations evaluated with 50-digit decimal
// arithmetic at a 200-point log-spaced DBH grid in [0.5, 100] cm, rounded to
// the nearest f64. Authored by tests/data/make_allometry_oracle.py.
// Columns: dbh_cm, fruit_kg, musacea_kg, cacao_kg, timber_kg.
pub const ALLOMETRY_ORACLE: [(f64, f64, f64, f64, f64); 200] = [
    (0.5, 0.031391373599526574, 0.006853735876720504, 0.03062157628965888, 18.01),
    (0.5134911573176756, 0.03330541046534943, 0.007253648039584743, 0.032279159154135185, 17.926354601438305),
    (0.5273463372868918, 0.03533615254995204, 0.007676894883108329, 0.03402646897866788, 17.84073263384903),
    (0.5415753620813668, 0.03749071576020827, 0.008124837974585367, 0.03586836279184567, 17.75309609941654),
    (0.5561883188998005, 0.03977664988359454, 0.008598918328100927, 0.03780996053907402, 17.663406813746022),
    (0.571195567116862, 0.042201965043338854, 0.009100661040212746, 0.03985665931457957, 17.571626446699334),
    (0.586607745627127, 0.044775159766628575, 0.009631680196122684, 0.04201414836381012, 17.477716566841476),
    (0.6024357803871723, 0.0475052507642308, 0.010193684062120973, 0.04428842489793275, 17.38163868973227),
    (0.6186908921611723, 0.05040180452587534, 0.010788480581006987, 0.04668581076438963, 17.28335433031181),
    (0.6353846044754913, 0.05347497084211383, 0.011417983188165204, 0.04921297001985126, 17.18282505964265),
    (0.6525287517879073, 0.056735518370118546, 0.012084216967006359, 0.05187692745441482, 17.08001256628736),
    (0.6701354878772615, 0.06019487236804664, 0.012789325163575591, 0.05468508811853967, 16.97487872261628),
    (0.6882172944594804, 0.06386515473019473, 0.013535576081284854, 0.05764525790699958, 16.867385656357524),
    (0.7067869900360764, 0.06775922646323027, 0.01432537037794956, 0.060765665257068904, 16.75749582771962),
    (0.7258577389814026, 0.07189073275234081, 0.015161248788603804, 0.06405498402125792, 16.645172112436256),
    (0.7454430608751035, 0.07627415077521685, 0.016045900298938136, 0.06752235757817691, 16.530377891103093),
    (0.7655568400863748, 0.08092484043141265, 0.016982170795653395, 0.0711774242485503, 16.413077145197942),
    (0.7862133356168307, 0.08585909816484592, 0.017973072221558556, 0.07503034408703037, 16.293234560198318),
    (0.807427191208953, 0.09109421406803461, 0.01902179226486404, 0.07909182712428417, 16.170815636234426),
    (0.8292134457272909, 0.09664853246817012, 0.020131704613840642, 0.0833731631378587, 16.045786806740775),
    (0.8515875438197685, 0.10254151620732532, 0.021306379809832784, 0.08788625303457877, 15.918115565596459),
    (0.8745653468666594, 0.10879381484204174, 0.02254959673353985, 0.09264364193171216, 15.787770603272318),
    (0.8981631442249908, 0.11542733700127326, 0.023865354761516463, 0.09765855402885802, 15.654721952532965),
    (0.9223976647763459, 0.12246532715623511, 0.025257886631998645, 0.10294492936749257, 15.518941144273189),
    (0.9472860887862544, 0.12993244707116697, 0.026731672061444698, 0.1085174625803535, 15.380401374101421),
    (0.9728460600835764, 0.1378548622204213, 0.02829145215559464, 0.11439164373837536, 15.239077680318045),
    (0.9990956985685134, 0.14626033347468964, 0.029942244661407956, 0.12058380140871855, 15.09494713397343),
    (1.026053613058115, 0.15517831437764457, 0.031689360108944506, 0.12711114804358153, 14.947989041729613),
    (1.053738914478388, 0.16464005435386342, 0.033538418895116426, 0.13399182782596444, 14.798185162290912),
    (1.0821712294123575, 0.17467870820968354, 0.035495369364268566, 0.14124496710538115, 14.645519937212326),
    (1.1113707140136866, 0.18532945231069, 0.037566506943752, 0.14889072756371735, 14.489980736940675),
    (1.141358068295719, 0.19662960784293382, 0.03975849439604919, 0.1569503622590212, 14.331558122991916),
    (1.1721545508060707, 0.20861877158979653, 0.04207838325260049, 0.1654462747030112, 14.170246127219592),
    (1.2037819936971788, 0.2213389546827584, 0.04453363649828433, 0.1744020811365214, 14.006042549183277),
    (1.2362628182034867, 0.2348347298122637, 0.04713215257952567, 0.18384267617599145, 13.838949272683363),
    (1.2696200505362392, 0.249153387414523, 0.04988229081326579, 0.19379430201347977, 13.668972602588633),
    (1.3038773382071585, 0.2643451013815485, 0.05279289827853354, 0.2042846213625582, 13.496123623146985),
    (1.3390589667925683, 0.2804631048750814, 0.05587333827712632, 0.21534279435285464, 13.32041857903686),
    (1.3751898771498539, 0.29756387686048275, 0.059133520454958184, 0.2269995595869906, 13.141879280487935),
    (1.4122956830984612, 0.31570734001421774, 0.06258393268097391, 0.23928731958522864, 12.96053353387462),
    (1.4504026895779722, 0.33495707069842073, 0.0662356747861824, 0.2522402308553414, 12.776415599265004),
    (1.4895379112961247, 0.35538052173831025, 0.07010049427134606, 0.2658942988380716, 12.589566676491366),
    (1.5297290918800008, 0.37704925878308715, 0.07419082409819673, 0.2802874779921041, 12.400035421396563),
    (1.571004723543957, 0.40003921107854507, 0.07851982268575057, 0.2954597772967577, 12.207878494003593),
    (1.613394067288243, 0.42443093753012584, 0.08310141624038875, 0.3114533714656667, 12.013161140453777),
    (1.6569271736426234, 0.45030990898872664, 0.08795034355587751, 0.328312718180591, 11.815957810662713),
    (1.7016349039697123, 0.4777668077484154, 0.0930822034274479, 0.3460846816712351, 11.616352813752428),
    (1.7475489523431187, 0.5068978453055218, 0.09851350483246378, 0.36481866298459115, 11.414441013433619),
    (1.7947018680159192, 0.5378050994925632, 0.10426172003910794, 0.3845667373059197, 11.210328565633635),
    (1.8431270784953773, 0.5705968721683476, 0.11034534081393368, 0.40538379871307934, 11.004133700794478),
    (1.892858913240275, 0.6053880687176411, 0.11678393790910029, 0.427327712766584, 10.795987553400623),
    (1.9439326279976532, 0.6423006006901937, 0.12359822402065947, 0.4504594773595436, 10.586035041439768),
    (1.9963844297962117, 0.6814638129900135, 0.13081012042042747, 0.47484339227460626, 10.37443579865056),
    (2.0502515026140893, 0.7230149371117937, 0.13844282747579423, 0.5005472379192211, 10.161365162570865),
    (2.1055720337392243, 0.7670995720126839, 0.14652089928432993, 0.5276424637360593, 9.947015221568293),
    (2.162385240840972, 0.8138721943044127, 0.15507032266328385, 0.5562043868123154, 9.731595924212327),
    (2.220731399772183, 0.8634966995535329, 0.16411860074808268, 0.5863124012399724, 9.515336254534576),
    (2.2806518731214407, 0.9161469765865448, 0.17369484146876016, 0.6180501988089875, 9.298485476921515),
    (2.3421891395357064, 0.9720075168123233, 0.1838298511889437, 0.6515060016468681, 9.08131445459251),
    (2.4053868238341614, 1.0312740606969713, 0.19455623380863096, 0.6867728074513106, 8.864117045836075),
    (2.470289727934583, 1.0941542836563967, 0.20590849564956437, 0.7239486479975735, 8.647211582409595),
    (2.53694386261419, 1.160868523770054, 0.21792315646061694, 0.7631368616391688, 8.430942434752676),
    (2.6053964801274696, 1.2316505538658244, 0.23063886690028876, 0.8044463805593463, 8.215681668922937),
    (2.675696107704106, 1.306748400681483, 0.24409653287424904, 0.8479920335718424, 8.001830800435812),
    (2.7478925819507625, 1.3864252139731807, 0.2583394471279148, 0.8938948653126036, 7.789822650477822),
    (2.8220370841811055, 1.470960188616375, 0.27341342851739187, 0.9422824727097417, 7.58012331026643),
    (2.8981821766991094, 1.5606495429303244, 0.2893669694068078, 0.9932893596670113, 7.373234219650117),
    (2.976381840061372, 1.6558075566543016, 0.30625139166620763, 1.0470573109467336, 7.169694366380332),
    (3.056691511344854, 1.7567676722126797, 0.3241210117718515, 1.1037357862914556, 6.970082612843754),
    (3.1391681234471682, 1.8638836631278275, 0.34303331554003375, 1.1634823358798858, 6.7750201574196245),
    (3.223870145447285, 1.977530873675041, 0.36304914305653685, 1.2264630382719657, 6.58517313802403),
    (3.3108576240552585, 2.098107534123374, 0.38423288439662756, 1.2928529620604314, 6.401255385821929),
    (3.4001922261803696, 2.2260361561711024, 0.4066526867652225, 1.3628366525121387, 6.224031337529721),
    (3.4919372826478443, 2.361765013465528, 0.4303806737235777, 1.4366086445518584, 6.05431911519753),
    (3.586157833095161, 2.5057697123950384, 0.4554931772077533, 1.5143740035145141, 5.892993782852269),
    (3.682920672079765, 2.658554858657604, 0.48207098308524227, 1.5963488951689904, 5.74099078990166),
    (3.782294396430859, 2.820655825445493, 0.510199591039705, 1.6827611865980037, 5.599309611747014),
    (3.8843494538788836, 2.9926406294421612, 0.5399694896198604, 1.77385107960435, 5.4690175986301535),
    (3.9891581929970994, 3.175111921204879, 0.5714764473373363, 1.8698717784041685, 5.3512540443495125),
    (4.096794914490735, 3.3687090969076765, 0.6048218207499456, 1.971090193463267, 5.247234487123282),
    (4.207335923870032, 3.574110538844306, 0.6401128805214723, 2.077787683432959, 5.1582552555558765),
    (4.320859585544508, 3.7920359925421065, 0.6774631565068798, 2.1902608372477568, 5.085698273379644),
    (4.437446378376844, 4.023249088816501, 0.7169928029730842, 2.308822298558992, 5.031036137398563),
    (4.557178952735707, 4.2685600196035205, 0.7588289851301735, 2.4338016347959894, 4.995837483857249),
    (4.6801421890880235, 4.5288283769468265, 0.8031062882165443, 2.5655462532706004, 4.981772659298648),
    (4.806423258172179, 4.804966165087189, 0.8499671504539484, 2.7044223668715492, 4.99061971286022),
    (4.9361116827948495, 5.097940996209169, 0.8995623212652631, 2.8508160120330017, 5.024270727893408),
    (5.069299401295254, 5.408779481043145, 0.9520513462290479, 3.005134121807006, 5.084738511777576),
    (5.206080832721799, 5.738570826203616, 1.0076030803309532, 3.167805657022602, 5.174163663840139),
    (5.346552943767371, 6.088470650869301, 1.0663962311631148, 3.3392827986759883, 5.294822042392352),
    (5.490815317510664, 6.459705036178902, 1.1286199338189538, 3.5200422048661593, 5.449132653048089),
    (5.638970224012344, 6.853574821532117, 1.1944743593328249, 3.710586335770029, 5.6396659817146),
    (5.791122692816024, 7.271460162850402, 1.2641713586218086, 3.9114448503400148, 5.869152796932683),
    (5.947380587405506, 7.714825368770149, 1.3379351440012028, 4.123176078606574, 6.140493447603151),
    (6.107854681671063, 8.185224031714748, 1.4160030104661165, 4.34636857367826, 6.456767683570344),
    (6.272658738438913, 8.68430447182513, 1.4986260990594775, 4.581642747753365, 6.821245028045957),
    (6.441909590119659, 9.213815512825082, 1.5860702047822168, 4.829652596690923, 7.237395732452338),
    (6.615727221532755, 9.775612610060225, 1.6786166316445978, 5.091087517934738, 7.708902345947188),
    (6.794234854965809, 10.37166435218406, 1.7765630976093885, 5.3666742268438945, 8.239671933667504),
    (6.977559037528968, 11.004059359273546, 1.880224692338033, 5.657178776756542, 8.833848979603284),
    (7.16582973086631, 11.675013601545697, 1.9899348908208254, 5.96340868840212, 9.495829011987121),
    (7.359180403287901, 12.386878164320965, 2.1060466261519464, 6.2862151945813185, 10.230272991170226),
    (7.557748124387724, 13.142147486442118, 2.2289334249003625, 6.626495606353176, 11.042122502153077),
    (7.761673662214691, 13.943468101017297, 2.3589906087291084, 6.985195807306842, 11.936615796258636),
    (7.971101583065489, 14.79364790911512, 2.496636566128434, 7.363312882851181, 12.919304728881219),
    (8.186180353970107, 15.695666018908074, 2.6423140983539843, 7.761897891831057, 13.996072642825103),
    (8.40706244794266, 16.65268318474138, 2.7964918438998265, 8.18205878817456, 15.173153249468163),
    (8.633904452072093, 17.66805288270655, 2.9596657860887543, 8.624963500692441, 16.45715056285658),
    (8.866867178529464, 18.7453330615299, 3.1323608486298, 9.091843179590931, 17.85505994486569),
    (9.106115778570418, 19.88829860995171, 3.3151325842757067, 9.58399561872207, 19.37429032275515),
    (9.351819859613737, 21.10095458428329, 3.5085689620127734, 10.102788863084685, 21.022687643817292),
    (9.604153605478965, 22.38755024249246, 3.7132922585323755, 10.649665011603753, 22.8085596353708),
    (9.863295899868238, 23.752593933993673, 3.929961060068869, 11.226144225758658, 24.740701942100362),
    (10.12943045318005, 25.200868897318934, 4.159272381043845, 11.833828955203533, 26.828425716699076),
    (10.40274593274467, 26.737450021025037, 4.401963906332196, 12.474408392125396, 29.08158674393902),
    (10.68343609657361, 28.36772162656926, 4.658816364363304, 13.149663166722013, 31.51061618269667),
    (10.971699930718025, 30.09739633546675, 4.930656038691594, 13.861470296851833, 34.12655301510098),
    (11.267741790333316, 31.932535086841217, 5.218357426115977, 14.611808405614312, 36.9410782968651),
    (11.571771544549987, 33.87956837551255, 5.5228460498992575, 15.402763221364168, 39.96655130802762),
    (11.884004725253442, 35.945318785041486, 5.845101437137537, 16.23653337544802, 43.216047708774724),
    (12.20466267987823, 38.137024894689446, 6.186160269857691, 17.115436513779567, 46.703399810759514),
    (12.533972728325029, 40.46236664406546, 6.5471197199798565, 18.041915739241702, 50.443239080393774),
    (12.872168324111609, 42.92949224434028, 6.929140978873352, 19.01854640282358, 54.45104099697839),
    (13.219489219872, 45.54704673032702, 7.33345299286046, 20.04804326237013, 58.7431723952805),
    (13.576181637321216, 48.324202253477374, 7.761356416685034, 21.13326802884325, 63.336941429275505),
    (13.942498441806086, 51.2706902219436, 8.214227797664172, 22.277237321071507, 68.2506503012739),
    (14.318699321565802, 54.396835400326836, 8.693524003983022, 23.48313105109975, 73.5036509085603),
    (14.705050971829284, 57.71359208860042, 9.200786911378373, 24.754301263447704, 79.11640356801853),
    (15.101827283880056, 61.23258250698431, 9.737648363288148, 26.09428145284872, 85.11053898802021),
    (15.509309539222434, 64.9661375212725, 10.305835420423081, 27.506796386368663, 91.5089236661319),
    (15.927786608986791, 68.92733985131996, 10.907175916648391, 28.99577245720802, 98.33572890099181),
    (16.35755515871521, 73.13006991409488, 11.543604339048413, 30.565348598967702, 105.61650361703315),
    (16.79891985867277, 77.58905446193543, 12.217168051090196, 32.21988779071737, 113.37825121162595),
    (17.252193599833525, 82.3199181864435, 12.93003387890572, 33.96398918484704, 121.64951064569827),
    (17.717697715694232, 87.33923846883958, 13.684495081880382, 35.80250089141369, 130.46044201101537),
    (18.195762210073152, 92.66460346862983, 14.482978729971974, 37.740533454520126, 139.84291682008097),
    (18.686725991055376, 98.31467375413298, 15.328053511492623, 39.78347405818634, 149.8306132781057),
    (19.19093711125062, 104.30924769082726, 16.222437996471182, 41.93700150120227, 160.45911681071064),
    (19.708753014533627, 110.66933081664196, 17.169009382178587, 44.2071019825869, 171.76602613602867),
    (20.240540789442207, 117.41720944729214, 18.170812748950425, 46.600085741533356, 183.79106518569125),
    (20.786677429412592, 124.5765287695772, 19.231070856082344, 49.12260459809455, 196.57620119587614),
    (21.34755010003655, 132.1723756962885, 20.353194509311194, 51.78167044336729, 210.16576930718816),
    (21.923556413529663, 140.2313667730569, 21.540793533233604, 54.584674730572175, 224.6066040307099),
    (22.5151047106054, 148.7817414451741, 22.797688383959827, 57.53940902120912, 239.9481779571413),
    (23.122614349954826, 157.8534610112042, 24.12792243936039, 60.654086643401214, 256.2427481065992),
    (23.746516005537188, 167.47831361012743, 25.535775006442705, 63.93736552263105, 273.5455103384296),
    (24.387251971892013, 177.69002560990018, 27.02577508770172, 67.398372248332, 291.91476226335817),
    (25.0452764776892, 188.52437978774637, 28.602715950730275, 71.04672744323291, 311.4120751245401),
    (25.721056007739566, 200.0193407162983, 30.27167054795956, 74.89257250597683, 332.102475139634),
    (26.41506963369388, 212.21518779494758, 32.038007836133666, 78.94659780134931, 354.0546348229709),
    (27.127809353664922, 225.15465639256192, 33.907410048017624, 83.22007237647797, 377.3410748353334),
    (27.859780441013342, 238.88308759614415, 35.885890971901134, 87.72487528560562, 402.03837693884475),
    (28.61150180254456, 253.44858709016765, 37.97981529770257, 92.47352861051122, 428.22740866610314),
    (29.383506346370726, 268.9021937233163, 40.19591909190891, 97.47923226836654, 455.9935603460579),
    (30.17634135969835, 285.2980583532997, 42.541331467218185, 102.75590070378338, 485.42699516430696),
    (30.990568896809517, 302.6936335964344, 45.023597516595174, 108.3182015670458, 516.622912972618),
    (31.82676617751175, 321.14987514688966, 47.650702585517955, 114.18159648604144, 549.6818286016177),
    (32.6855259963391, 340.7314553710442, 50.43109796049888, 120.36238404522797, 584.7098654718891),
    (33.567457142794304, 361.50698992540066, 53.37372805651776, 126.87774509110166, 621.8190653422455),
    (34.47318483292985, 383.5492781921464, 56.48805919082803, 133.74579049010444, 661.1277150798927),
    (35.40335115257457, 406.93555837488356, 59.7841100357019, 140.98561147172714, 702.7606913856591),
    (36.35861551251916, 431.74777814839103, 63.27248384807752, 148.6173326967435, 746.8498244585189),
    (37.33965511598372, 458.0728818108061, 66.96440257979047, 156.66216819809193, 793.5342816375638),
    (38.3471654386987, 486.0031149444347, 70.8717429781208, 165.14248034990501, 842.960972116411),
    (39.38186072193953, 515.6363476527484, 75.00707479278951, 174.0818420286034, 895.2849738849806),
    (40.44447447886447, 547.0764175062221, 79.38370121231489, 183.50510213884561, 950.6699841168164),
    (41.535760014514636, 580.4334933987218, 84.01570165981046, 193.43845468647555, 1009.2887942868044),
    (42.65649095984474, 615.8244615894316, 88.91797708589667, 203.909511590472, 1071.3237913744929),
    (43.807461820163276, 653.3733352830458, 94.10629790443231, 214.94737943629679, 1136.967486582412),
    (44.98948853837104, 693.2116891834382, 99.59735472527312, 226.58274038399594, 1206.4230730770435),
    (46.20340907339691, 735.4791205435131, 105.40881204726143, 238.84793745595192, 1279.905014342597),
    (47.45008399424116, 780.3237383268046, 111.5593650841756, 251.77706444136447, 1357.6396648248244),
    (48.7303970900476, 827.9026821948971, 118.06879990644674, 265.4060606673715, 1439.8659246339218),
    (50.04525599663686, 878.382673139242, 124.95805709211541, 279.77281090024434, 1526.8359301723729),
    (51.395592839944854, 931.9405976868301, 132.24929909179022, 294.9172506543546, 1618.8157826557324),
    (52.782364896822635, 988.7641277268302, 139.96598152431835, 310.88147720164056, 1716.0863166020702),
    (54.2065552736666, 1049.0523781301465, 148.1329286325266, 327.7098665901561, 1818.9439104794508),
    (55.66917360335922, 1113.016604466216, 156.77641314176532, 345.44919699696794, 1927.701341820554),
    (57.17125676101509, 1180.8809432619387, 165.92424077816133, 364.14877875829825, 2042.688689240041),
    (58.713869599039235, 1252.8831973966574, 175.60583971846827, 383.8605914383518, 2164.254283923485),
    (60.29810570201948, 1329.275669385311, 185.85235525927524, 404.6394283178504, 2292.765713297381),
    (61.92508816198702, 1410.326045469625, 196.6967500101149, 426.54304870390024, 2428.61087973789),
    (63.59597037459566, 1496.3183336153022, 208.17390993279244, 449.63233848457867, 2572.1991173325323),
    (65.31193685678353, 1587.5538587020292, 220.32075656805654, 473.97147937453235, 2723.962369873869),
    (67.07420408649743, 1684.3523183935415, 233.17636581064318, 499.62812732204566, 2884.356433438303),
    (68.88402136507504, 1787.0529033876312, 246.78209361478733, 526.673600573502, 3053.8622670865734),
    (70.74267170289575, 1896.0154859715065, 261.1817090345864, 555.1830779179943, 3232.987375416003),
    (72.65147272892868, 2011.6218810473604, 276.42153502720714, 585.2358076631604, 3422.267266898824),
    (74.61177762482227, 2134.2771840468645, 292.55059747188926, 616.9153279231283, 3622.2669921560723),
    (76.62497608419805, 2264.4111904228025, 309.62078288413903, 650.3096988309211, 3833.582766543727),
    (78.69249529782813, 2402.479901691825, 327.68700533246636, 685.5117473207927, 4056.843681667134),
    (80.81580096539508, 2548.967123305667, 346.8073830946338, 722.619325160929, 4292.713510692485),
    (82.99639833455127, 2704.386159949894, 367.0434256217095, 761.7355809537662, 4541.892612590423),
    (85.23583326801506, 2869.2816142107185, 388.4602314113882, 802.9692468600265, 4805.119940728014),
    (87.53569333945903, 3044.2312949124894, 411.12669742711824, 846.4349408434593, 5083.175161521421),
    (89.89760895896791, 3229.848241812895, 435.1157407367331, 892.2534852764556, 5376.880889174408),
    (92.32325452886452, 3426.782873750639, 460.5045330835959, 940.5522427921803, 5687.1050428575045),
    (94.81434963072195, 3635.7252677727984, 487.3747491448497, 991.4654703167728, 6014.763333030102),
    (97.37266024440436, 3857.407577228221, 515.8128292754195, 1045.1346922657444, 6360.8218839748215),
    (100.0, 4092.6065973001087, 545.9102575829951, 1101.709093941939, 6726.3),
];
